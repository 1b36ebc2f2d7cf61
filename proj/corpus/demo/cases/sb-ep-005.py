import requests

API_HOST = 'https://api.switch-bot.com'
HEADERS = {'Authorization': 'token', 'sign': 's', 't': '1700000000', 'nonce': 'n-1'}


def get_device_list():
    url = API_HOST + '/v2.0/devices'
    response = requests.get(url, headers=HEADERS)
    return response.json()

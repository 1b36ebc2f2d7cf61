import requests

BASE = 'https://api.switch-bot.com/v1.1'
HEADERS = {'Authorization': 'token', 'sign': 's', 't': '1700000000', 'nonce': 'n-1'}


def device_status(device_id):
    url = f'{BASE}/device/{device_id}/status'
    response = requests.get(url, headers=HEADERS)
    return response.json()

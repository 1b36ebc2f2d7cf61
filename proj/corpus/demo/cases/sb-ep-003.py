import requests

BASE = 'https://api.switch-bot.com/v1.1'
HEADERS = {'Authorization': 'token', 'sign': 's', 't': '1700000000', 'nonce': 'n-1'}


def press(device_id):
    url = f'{BASE}/devices/{device_id}/command'
    body = {'commandType': 'command', 'command': 'press', 'parameter': 'default'}
    response = requests.post(url, headers=HEADERS, json=body)
    return response.json()
